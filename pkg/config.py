"""
Saturation Toolkit Configuration
Environment-driven settings for search, Cayley checks and logging
"""

import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration"""
    LOG_LEVEL = os.environ.get('SATURATION_LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # Graph limits
    MAX_ORDER = 320
    MAX_SEARCH_ORDER = 64

    # Search workers
    SEARCH_WORKERS = int(os.environ.get('SATURATION_WORKERS', 1))
    SPLIT_DEPTH = int(os.environ.get('SATURATION_SPLIT_DEPTH', 3))
    CHECKPOINT_FSYNC = os.environ.get('SATURATION_CHECKPOINT_FSYNC', 'True').lower() == 'true'

    # Cayley checks
    CAYLEY_WINDOW_STATE_LIMIT = int(os.environ.get('CAYLEY_WINDOW_STATE_LIMIT', 200000))
    CAYLEY_SCAN_WORKERS = int(os.environ.get('CAYLEY_SCAN_WORKERS', 1))

    # Long-running tests
    EXTENDED_TESTS = os.environ.get('SATURATION_EXTENDED', 'False').lower() == 'true'


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    """Production configuration"""
    LOG_LEVEL = os.environ.get('SATURATION_LOG_LEVEL', 'WARNING')


class TestingConfig(Config):
    """Testing configuration"""
    LOG_LEVEL = 'WARNING'
    SEARCH_WORKERS = 1
    CAYLEY_SCAN_WORKERS = 1
    CHECKPOINT_FSYNC = False


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}


def get_config(name=None):
    """Resolve a configuration class by name or SATURATION_CONFIG."""
    key = name or os.environ.get('SATURATION_CONFIG') or 'default'
    if key not in config:
        raise KeyError(f"Unknown configuration: {key}")
    return config[key]
