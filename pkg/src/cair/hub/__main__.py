from cair.hub.cli import main

raise SystemExit(main())
