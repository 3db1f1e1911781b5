from lambertkit.cli import main

raise SystemExit(main())
