"""Config-driven verification of the kernel, cycle and L-value identities."""
from .config import VerificationConfig, load_config, parse_config
from .report import CheckReport

__all__ = ["CheckReport", "VerificationConfig", "load_config", "parse_config"]
