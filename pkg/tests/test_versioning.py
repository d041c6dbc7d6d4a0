"""
Unit tests for the artifact versioning.
"""

import pytest

from lib.errors import VersionMismatch
from lib.version import (
    check_artifact_version,
    get_schema_version,
    get_version_info,
    is_version_compatible,
)


class TestVersionModule:
    """Tests for the version module."""

    def test_get_schema_version(self):
        """Test that current version is returned correctly."""
        version = get_schema_version()
        assert isinstance(version, str)
        assert len(version.split('.')) == 3  # Should be semantic versioning

    def test_version_compatibility_current(self):
        assert is_version_compatible(get_schema_version(), "1.0.0")

    def test_version_compatibility_future(self):
        """Test that future versions are not compatible."""
        assert not is_version_compatible("99.0.0", "1.0.0")

    def test_version_compatibility_too_old(self):
        """Test that versions below minimum are not compatible."""
        assert not is_version_compatible("0.9.0", "1.0.0")

    def test_version_compatibility_invalid(self):
        """Test that invalid version strings return False."""
        assert not is_version_compatible("invalid", "1.0.0")
        assert not is_version_compatible(None, "1.0.0")
        assert not is_version_compatible("1.0", "1.0.0")

    def test_get_version_info_current(self):
        info = get_version_info()
        assert "changes" in info
        assert "main_effects" in info["artifact_sections"]

    def test_get_version_info_invalid(self):
        assert get_version_info("99.99.99") is None


class TestArtifactVersionCheck:
    """Tests for the check applied when a model artifact is loaded."""

    def test_current_version_passes(self):
        check_artifact_version(get_schema_version())

    @pytest.mark.parametrize("version", ["9.0.0", "0.1.0", None, "garbage"])
    def test_unreadable_versions_raise(self, version):
        with pytest.raises(VersionMismatch):
            check_artifact_version(version)


# Run tests
if __name__ == "__main__":
    pytest.main([__file__, "-v"])
