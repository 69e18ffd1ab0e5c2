from django.core.exceptions import ValidationError


class ResourceLimitError(ValidationError):
    """Raised when a request exceeds what an engine is allowed to compute"""
