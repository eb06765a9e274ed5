"""Grid-based numerical checks of biharmonic and biconservative geometry in constant-curvature spaces."""

__version__ = "0.1.0"
