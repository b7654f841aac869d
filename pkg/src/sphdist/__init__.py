"""Exact audits of spherical s-distance sets, designs and Q-polynomial schemes."""

__version__ = "0.1.0"

from .errors import InputError, InvariantViolation, SphdistError  # noqa: E402

__all__ = ["__version__", "InputError", "InvariantViolation", "SphdistError"]
