"""Reverberation-aware features for sound event localization with distance.

Thin Python layer over the C++ core: feature extraction (log-mel, intensity
vectors, DRR, direct-plus-reverberant spectrograms, short-term autocorrelation),
weighted-prediction-error dereverberation, floor-reflection geometry, scene
simulation, channel-swap augmentation, and location-dependent scoring.
"""

from ._revfeat import (
    SPEED_OF_SOUND,
    AcsTransform,
    ClassScore,
    EventRecord,
    FeatureStack,
    ItdgRow,
    JackknifeEstimate,
    ReflectionLag,
    RirTail,
    SceneGeometry,
    SeldScores,
    SyntheticRIR,
    acs_audio,
    acs_labels,
    acs_transforms,
    angular_error,
    burst_noise,
    direct_delay,
    extract,
    first_reflection_delay,
    itdg,
    itdg_table,
    jackknife_ci,
    make_rir,
    read_metadata_csv,
    read_tensor,
    read_wav,
    reflection_lag,
    relative_distance_error,
    score,
    spatialize,
    split_direct_reverb,
    stpacc,
    true_drr,
    wrap_azimuth,
    write_metadata_csv,
    write_tensor,
    write_wav,
)

__version__ = "1.0.0"

__all__ = [
    "SPEED_OF_SOUND",
    "AcsTransform",
    "ClassScore",
    "EventRecord",
    "FeatureStack",
    "ItdgRow",
    "JackknifeEstimate",
    "ReflectionLag",
    "RirTail",
    "SceneGeometry",
    "SeldScores",
    "SyntheticRIR",
    "acs_audio",
    "acs_labels",
    "acs_transforms",
    "angular_error",
    "burst_noise",
    "direct_delay",
    "extract",
    "first_reflection_delay",
    "itdg",
    "itdg_table",
    "jackknife_ci",
    "make_rir",
    "read_metadata_csv",
    "read_tensor",
    "read_wav",
    "reflection_lag",
    "relative_distance_error",
    "score",
    "spatialize",
    "split_direct_reverb",
    "stpacc",
    "true_drr",
    "wrap_azimuth",
    "write_metadata_csv",
    "write_tensor",
    "write_wav",
    "__version__",
]
