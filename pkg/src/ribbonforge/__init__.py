"""ribbonforge: folded ribbon knots built from polygonal knot diagrams."""
__version__ = "0.1.0"
