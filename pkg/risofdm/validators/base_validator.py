"""
Base Validator Class

Validators collect every violation of a subject before reporting, so one
failed construction names all bad entries at once.
"""

from abc import ABC, abstractmethod
from typing import Any, List, Optional


class BaseValidator(ABC):
    """Abstract base class for config and scenario validators."""

    def __init__(self):
        self.errors: List[str] = []
        self.warnings: List[str] = []

    @abstractmethod
    def validate(self, subject: Any) -> bool:
        """
        Check a subject against this validator's rules.

        Args:
            subject: Object being validated

        Returns:
            True when no error was recorded
        """

    @staticmethod
    def _entry(message: str, name: Optional[str]) -> str:
        return f"{name} - {message}" if name else message

    def add_error(self, message: str, name: Optional[str] = None):
        self.errors.append(self._entry(message, name))

    def add_warning(self, message: str, name: Optional[str] = None):
        self.warnings.append(self._entry(message, name))

    def clear_results(self):
        """Forget the results of a previous validate() call."""
        self.errors.clear()
        self.warnings.clear()

    def error_summary(self) -> str:
        """All collected errors joined into one message."""
        return '; '.join(self.errors)
