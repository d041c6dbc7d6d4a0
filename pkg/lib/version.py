"""
Schema versioning for model artifacts.

Version History:
- 1.0.0: Initial artifact layout (feature spec with embedded zone model,
         binned main and pairwise functions, training report, effective config)
"""

from lib.errors import VersionMismatch

# Current artifact schema version
ARTIFACT_SCHEMA_VERSION = "1.0.0"

# Oldest artifact layout this code can still read
MIN_SUPPORTED_VERSION = "1.0.0"

VERSION_HISTORY = {
    "1.0.0": {
        "changes": [
            "Initial artifact schema",
            "Feature spec embeds the frozen zone model",
            "Main effects and whitelisted pairwise effects as binned tables",
            "Training report with per-bag validation curves",
        ],
        "artifact_sections": [
            "feature_spec",
            "intercept",
            "main_effects",
            "pair_effects",
            "whitelist",
            "training_report",
            "config",
        ],
    }
}


def get_schema_version():
    """Returns the current artifact schema version."""
    return ARTIFACT_SCHEMA_VERSION


def get_version_info(version=None):
    """
    Returns information about a specific version.

    Args:
        version: Version string (e.g., "1.0.0"). If None, returns current version info.

    Returns:
        Dictionary with version information or None if version not found.
    """
    if version is None:
        version = ARTIFACT_SCHEMA_VERSION
    return VERSION_HISTORY.get(version)


def _version_tuple(v):
    return tuple(map(int, v.split('.')))


def is_version_compatible(file_version, min_supported_version=MIN_SUPPORTED_VERSION):
    """
    Checks if an artifact version can be read by this code.

    The artifact version must be >= the minimum supported version and <= the current one.
    """
    try:
        file_ver = _version_tuple(file_version)
        if len(file_ver) != 3:
            return False
        return _version_tuple(min_supported_version) <= file_ver <= _version_tuple(ARTIFACT_SCHEMA_VERSION)
    except (ValueError, AttributeError):
        return False


def check_artifact_version(file_version):
    """Raises VersionMismatch unless the artifact version is readable."""
    if not is_version_compatible(file_version):
        raise VersionMismatch(
            f"artifact schema version {file_version!r} is not supported "
            f"(supported: {MIN_SUPPORTED_VERSION} to {ARTIFACT_SCHEMA_VERSION})"
        )
