from cair.loadgen.cli import main

raise SystemExit(main())
