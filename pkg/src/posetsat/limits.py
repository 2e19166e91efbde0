"""Size caps shared across the package.

Sets are stored as Python ints (bit ``i - 1`` for element ``i``), so none of
these are hard word-size limits; they bound the exponential parts of the work.
"""

MAX_POSET_SIZE = 16
MAX_INNER_DIM = 24
MAX_UNIVERSE = 60
MAX_CHAIN_FAMILY = 64
MAX_ORDER_EXPORT = 16

# exact search enumerates subfamilies of B_{n+e}
MAX_SEARCH_DIM = 6
MAX_EXTERNAL_CAP = 3
