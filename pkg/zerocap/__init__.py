"""zerocap: no-signalling assisted zero-error capacities and simulation costs."""

__version__ = "0.1.0"
