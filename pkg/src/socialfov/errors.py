"""Exception hierarchy.

Everything raised on purpose derives from :class:`SocialFovError`. Format and
input problems derive from :class:`InputError` so the CLI can map them to exit
code 1; configuration problems raise :class:`ConfigError` (exit code 2).
"""


class SocialFovError(Exception):
    pass


class GeometryError(SocialFovError, ValueError):
    pass


class NonPositiveDepth(GeometryError):
    pass


class OutOfBounds(GeometryError):
    pass


class BehindCamera(GeometryError):
    pass


class NoValidDepth(GeometryError):
    pass


class MissingJoints(GeometryError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("missing joints: " + ", ".join(self.missing))


class DegenerateDirection(GeometryError):
    pass


class InvalidGaze(GeometryError):
    pass


class CoincidentPoints(GeometryError):
    pass


class MissingPelvis(GeometryError):
    pass


class InvalidEstimate(GeometryError):
    pass


class NoSharedJoints(GeometryError):
    pass


class NonRigidExtrinsics(GeometryError):
    pass


class InputError(SocialFovError):
    """Malformed or missing input data."""


class MalformedLine(InputError):
    def __init__(self, path, lineno, reason):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {reason}")


class NonMonotonicTimestamp(MalformedLine):
    pass


class MissingDepthFile(InputError):
    pass


class MissingFile(InputError):
    pass


class PgmError(InputError):
    pass


class BadMagic(PgmError):
    pass


class BadMaxval(PgmError):
    pass


class TruncatedData(PgmError):
    pass


class TrailingData(PgmError):
    pass


class ConfigError(SocialFovError):
    pass
