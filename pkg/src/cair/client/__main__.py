from cair.client.cli import main

raise SystemExit(main())
