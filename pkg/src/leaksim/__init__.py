"""leaksim: what-if engine for the global carbon effect of PoW mining bans.

Pipeline: ingest datasets -> build the hash-rate atlas -> estimate network
power -> compute per-entry carbon intensity -> evaluate ban scenarios under
current-proportion redistribution -> report tables, map-join data, and
fixture consistency checks.
"""

__version__ = "0.1.0"
