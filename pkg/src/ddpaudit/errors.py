"""Exception types shared across the toolkit."""


class ConfigurationError(ValueError):
    """A manifest, ruleset, matrix, or argument is invalid."""


class DdpError(Exception):
    """Base class for input-data failures."""


class NotADdpError(DdpError):
    """The input tree matched no manifest entry at all."""


class AmbiguousPlatformError(DdpError):
    """Two or more platform manifests matched the tree equally well."""

    def __init__(self, candidates):
        self.candidates = tuple(candidates)
        super().__init__(
            "tree matches multiple platforms equally: " + ", ".join(self.candidates)
        )


class HarError(DdpError):
    """The input file is not a parseable HTTP Archive."""
