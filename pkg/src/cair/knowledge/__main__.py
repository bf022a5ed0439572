from cair.knowledge.cli import main

raise SystemExit(main())
