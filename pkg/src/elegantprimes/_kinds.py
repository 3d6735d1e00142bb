"""Integer tags shared by both kernel backends and the public wrappers.

The numeric values are part of the cross-backend contract: the compiled and
pure-Python kernels emit raw outcome tuples tagged with these constants, and
tests compare them directly.
"""

(
    EXTEND_LEFT,
    EXTEND_RIGHT,
    REVERSE_PREFIX,
    REVERSE_SUFFIX,
    ROTATE_FREE,
    ROTATE_NEUTRAL,
    INSERT_MIDDLE,
    INSERT_REV_PREFIX,
    INSERT_REV_SUFFIX,
    SUBSTITUTE,
) = range(10)

KIND_NAMES = (
    "extend_left",
    "extend_right",
    "reverse_prefix",
    "reverse_suffix",
    "rotate_free",
    "rotate_neutral",
    "insert_middle",
    "insert_rev_prefix",
    "insert_rev_suffix",
    "substitute",
)

# Path ends for extension.
LEFT, RIGHT = 0, 1

# Insertion shapes: r between the halves, r after the reversed prefix,
# r before the reversed suffix.
SHAPE_MIDDLE, SHAPE_REV_PREFIX, SHAPE_REV_SUFFIX = 0, 1, 2

# Where the replaced prime sat in the source path.
SOURCE_LEFT, SOURCE_INTERIOR, SOURCE_RIGHT = 0, 1, 2

SOURCE_NAMES = ("q|A|B", "A|q|B", "A|B|q")

# Recombination targets: r placement (front, middle, back) crossed with the
# four reversal patterns of the two segments. Index t encodes
# placement = t // 4, reverse first segment = (t % 4) >= 2,
# reverse second segment = t % 2.
TARGET_NAMES = (
    "r.A.B",
    "r.A.~B",
    "r.~A.B",
    "r.~A.~B",
    "A.r.B",
    "A.r.~B",
    "~A.r.B",
    "~A.r.~B",
    "A.B.r",
    "A.~B.r",
    "~A.B.r",
    "~A.~B.r",
)
