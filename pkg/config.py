"""
Configuration module for the cascade speculative decoding toolkit.
Centralizes runtime settings and environment variables.
"""

import os
from dotenv import load_dotenv
from typing import Optional

# Load environment variables
load_dotenv()


class Config:
    """Runtime configuration class."""

    # Logging Configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE')  # optional rotating file log

    # Output Configuration
    OUTPUT_DIR = os.getenv('CASCADE_OUTPUT_DIR', 'results')
    CSV_FLOAT_FORMAT = os.getenv('CSV_FLOAT_FORMAT', '%.6f')

    # Ensemble Configuration
    WORKERS = int(os.getenv('CASCADE_WORKERS', 1))

    # Step logs grow with the horizon; long Monte Carlo runs can switch them off
    KEEP_STEP_LOG = os.getenv('KEEP_STEP_LOG', 'true').lower() in ('1', 'true', 'yes')

    @classmethod
    def validate(cls) -> list[str]:
        """Validate configuration values."""
        errors = []

        if cls.WORKERS < 1:
            errors.append(f"CASCADE_WORKERS must be >= 1, got {cls.WORKERS}")

        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"LOG_LEVEL must be a logging level name, got {cls.LOG_LEVEL!r}")

        if os.path.exists(cls.OUTPUT_DIR) and not os.path.isdir(cls.OUTPUT_DIR):
            errors.append(f"CASCADE_OUTPUT_DIR {cls.OUTPUT_DIR!r} exists and is not a directory")

        return errors

    @classmethod
    def get_output_dir(cls, override: Optional[str] = None) -> str:
        """Resolve the output directory; the environment wins over config files."""
        env_dir = os.getenv('CASCADE_OUTPUT_DIR')
        if env_dir:
            return env_dir
        return override or cls.OUTPUT_DIR

    @classmethod
    def is_production(cls) -> bool:
        """Check if running in production mode."""
        return cls.LOG_LEVEL.upper() != 'DEBUG'


class DevelopmentConfig(Config):
    """Development configuration."""
    LOG_LEVEL = 'DEBUG'
    OUTPUT_DIR = 'results-dev'


class ProductionConfig(Config):
    """Production configuration."""
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')


class TestingConfig(Config):
    """Testing configuration."""
    TESTING = True
    LOG_LEVEL = 'WARNING'
    WORKERS = 1
    KEEP_STEP_LOG = True


# Configuration mapping
config_map = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}


def get_config(config_name: Optional[str] = None) -> type[Config]:
    """Get configuration based on environment."""
    if config_name is None:
        config_name = os.getenv('CASCADE_ENV', 'default')

    return config_map.get(config_name, config_map['default'])
