"""Flots batch : un module par flot, chacun avec run(...) et main()."""
