"""Text-to-SQL training data synthesis from typed query templates."""

__version__ = "0.1.0"
