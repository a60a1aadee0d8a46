class PacklabError(Exception):
    pass


class InvalidParameter(PacklabError, ValueError):
    pass


class SizeCapExceeded(PacklabError):
    """Raised instead of approximating when an instance is beyond a configured cap."""

    def __init__(self, message, cap_name=None, cap=None):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap = cap


class EnumerationLimitExceeded(PacklabError):
    def __init__(self, message, count):
        super().__init__(message)
        self.count = count
