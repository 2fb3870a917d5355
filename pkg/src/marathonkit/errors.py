"""Exception hierarchy shared by all marathonkit modules."""


class MarathonKitError(Exception):
    """Base class for all toolkit errors."""


# geometry / core model

class DegenerateBox(MarathonKitError):
    """Box has zero or negative width/height."""


class NegativeCoordinate(MarathonKitError):
    """Box or point coordinate is negative."""


class MalformedTime(MarathonKitError):
    """Clock string does not parse as H:MM:SS / HH:MM:SS / MM:SS."""


class MalformedIdentity(MarathonKitError):
    """Identity string is neither a bare bib number nor an LiRj label."""


# ingestion

class MissingColumn(MarathonKitError):
    """Runner CSV header lacks a required column."""


class MalformedRow(MarathonKitError):
    """Runner CSV row failed to parse; carries the 1-based row number."""

    def __init__(self, row_no, message):
        super().__init__(f"row {row_no}: {message}")
        self.row_no = row_no


class DuplicateBib(MarathonKitError):
    """Two runner CSV rows share a bib number."""


class NonDivisorFps(MarathonKitError):
    """Requested fps does not divide the 30 fps source rate."""


class EmptyManifest(MarathonKitError):
    """Dataset statistics requested over zero videos."""


# sampling

class ComponentOutOfRange(MarathonKitError):
    """A location score component lies outside [1, 5]."""


class EmptySample(MarathonKitError):
    """KS statistic requested for an empty sample."""


class InsufficientDistinctScores(MarathonKitError):
    """Fewer distinct score values than the requested subset size."""


# metrics

class UndefinedMetric(MarathonKitError):
    """Precision or recall denominator is zero."""


class ZeroTotal(MarathonKitError):
    """Unidentified-runner rate requested with zero total runners."""


# alignment

class NonMonotoneSplit(MarathonKitError):
    """Split distances/times are not strictly increasing."""


class InsufficientSplits(MarathonKitError):
    """Timeline needs at least two split points."""


class UnknownLocation(MarathonKitError):
    """Location number outside the 1..42 course range."""


class DimensionMismatch(MarathonKitError):
    """Probe feature length differs from the gallery's."""


class EmptyGallery(MarathonKitError):
    """Ranking requested against an empty gallery."""


class UndecodableImage(MarathonKitError):
    """Image bytes could not be decoded."""
