"""Exception hierarchy shared by all modules, with CLI exit codes."""

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_CERTIFICATION = 4


class DenseModelError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = EXIT_VALIDATION


class ValidationError(DenseModelError):
    """Bad input: domain violations, majorization failures, malformed files."""

    exit_code = EXIT_VALIDATION


class ResourceError(DenseModelError):
    """A configured size/work cap would be exceeded."""

    exit_code = EXIT_RESOURCE


class CertificationError(DenseModelError):
    """A certified inequality failed to hold on an instance."""

    exit_code = EXIT_CERTIFICATION
