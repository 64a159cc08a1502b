"""Settings module for causal-metrics.

Runtime configuration is a pydantic-settings model. Unlike a service, the tool
honours no environment variables: every value comes from a command-line flag
(or a keyword argument when used as a library).
"""

import os
import re
from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


def get_package_version() -> str:
    """Get the version of the causal-metrics package from pyproject.toml.

    Returns:
        The package version or a default value if not found
    """
    current_dir = Path(__file__).parent
    for _ in range(4):
        pyproject_path = current_dir / "pyproject.toml"
        if pyproject_path.exists():
            try:
                content = pyproject_path.read_text()
                version_match = re.search(r'version\s*=\s*"([^"]+)"', content)
                if version_match:
                    return version_match.group(1)
            except Exception:
                pass
        current_dir = current_dir.parent

    return "dev-version"


def _available_cores() -> int:
    return os.cpu_count() or 1


class Settings(BaseSettings):
    """Settings for causal-metrics.

    Only init kwargs are read; see ``settings_customise_sources``.
    """

    log_level: Literal["debug", "info", "warning", "error", "critical"] = Field(
        default="warning", description="Logging level"
    )
    debug: bool = Field(default=False, description="Attach tracebacks to error logs")
    jobs: int = Field(
        default_factory=_available_cores,
        ge=1,
        description="Worker threads for dataset rows and CED pair checks",
    )
    mec_limit: int = Field(
        default=16,
        ge=0,
        description="Maximum number of undirected edges a CPDAG may carry for MEC enumeration",
    )
    oracle_max_nodes: int = Field(
        default=8,
        ge=1,
        description="Node budget of the path-enumeration reference oracle",
    )
    default_metrics: str = Field(
        default="shd-c,csd,sid,ced",
        description="Metrics computed when --metrics is not given",
    )
    version: str = Field(
        default_factory=get_package_version,
        description="Package version from pyproject.toml",
    )

    model_config = SettingsConfigDict(
        extra="ignore",
        case_sensitive=False,
        validate_default=True,
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @property
    def metric_list(self) -> list[str]:
        return [name.strip() for name in self.default_metrics.split(",") if name.strip()]


settings = Settings()
