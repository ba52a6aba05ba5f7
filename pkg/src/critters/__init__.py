"""Critters: a server-authoritative mutation-testing game engine.

Critters run short block-based programs while walking a tile map; players
place block-based tests (portals on base levels, signpost tests on loop
levels) to separate healthy critters from mutants.  This package provides
the language, the mutation machinery, the deterministic simulation, the
built-in levels, an HTTP service and a CLI.
"""

__version__ = "0.1.0"
