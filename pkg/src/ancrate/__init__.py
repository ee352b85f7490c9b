"""Rate bounds and amplify-and-forward schemes for analog network coding."""

__version__ = "0.1.0"
