"""Run the adenewton command line."""

from .cli import main

raise SystemExit(main())
