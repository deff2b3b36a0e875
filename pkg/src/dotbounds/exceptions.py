"""Exception types shared across the package."""


class ZeroInnerProduct(ValueError):
    """The exact inner product is zero, so no relative quantity is defined."""


class InputNotRepresentable(ValueError):
    """An input element changes value when cast to the working precision."""


class EvenDimension(ValueError):
    """The alternating-products family requires an odd dimension."""
