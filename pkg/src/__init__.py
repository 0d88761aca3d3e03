"""pearlsim: intermittent-computing runtime simulator."""

__version__ = "0.1.0"
