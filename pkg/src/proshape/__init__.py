"""proshape: exact decision procedures for inverse systems and
enriched pro-categories at desk scale."""

__version__ = "0.1.0"
