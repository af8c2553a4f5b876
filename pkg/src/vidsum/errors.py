"""Exception types shared across the pipeline."""


class VidsumError(Exception):
    """Base class for all pipeline errors."""


# --- feature / annotation / summary I/O ---

class MalformedHeader(VidsumError):
    """Feature file header is unreadable or declares invalid metadata."""


class DimensionMismatch(VidsumError):
    """Declared matrix size disagrees with the data actually present."""


class InvalidDistribution(VidsumError):
    """A probability row has negative entries or its sum is too far from 1."""


class MalformedRecord(VidsumError):
    """An annotation record is structurally broken (e.g. inverted bounds)."""


class IntervalOutOfRange(VidsumError):
    """An annotation interval falls outside [0, n_source_frames)."""


class IndexOutOfRange(VidsumError):
    """A sampled-frame index is outside [0, n_frames)."""


# --- affinity graphs ---

class LengthMismatch(VidsumError):
    """Two vectors or timelines that must align have different lengths."""


class InvalidSigma(VidsumError):
    """Temporal smoothing width must be positive."""


class SizeMismatch(VidsumError):
    """Two graphs/structures that must share a size do not."""


# --- segmentation ---

class InvalidK(VidsumError):
    """Neighborhood size must satisfy 1 <= k < n."""


class DegenerateGraphWarning(UserWarning):
    """All edge weights are equal; clustering has no structure to use."""


# --- ranking ---

class NegativeWeight(VidsumError):
    """Ranking requires non-negative edge weights (and init scores)."""


class NonFiniteInput(VidsumError):
    """NaN or infinity where a finite value is required."""


# --- selection ---

class InstanceTooLarge(VidsumError):
    """Knapsack instance exceeds the exact solver's table bound."""


# --- evaluation ---

class VideoMismatch(VidsumError):
    """Summary and annotations disagree on video identity or extent."""


class TooFewAnnotators(VidsumError):
    """The requested statistic needs more annotators than are present."""


class BudgetTooLarge(VidsumError):
    """Summary budget exceeds the number of source frames."""
