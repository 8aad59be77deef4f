from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "multiplier-testbench"

    # Logging
    LOG_LEVEL: str = "INFO"
    JSON_LOGS: bool = False

    # Environment
    ENV: str = "development"

    # Artifacts
    OUTPUT_DIR: str = "./results"
    METRICS_FILE: str = ""  # prometheus textfile target, empty disables export

    # Execution
    THREADS: int = 0  # 0 means machine parallelism
    DEFAULT_SEED: int = 0

    # Numerical defaults
    ARC_LIMIT: int = 4096  # largest grid for exhaustive arc characteristics
    GAUGE_RESTARTS: int = 32
    ASCENT_ITERATIONS: int = 200
    RADEMACHER_EXACT_MAX: int = 14
    RADEMACHER_DRAWS: int = 10_000

    # Tracking
    MLFLOW_TRACKING_URI: str = ""
    MLFLOW_EXPERIMENT: str = "multiplier-testbench"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="TESTBENCH_",
        case_sensitive=False,
        extra="ignore",
    )


settings = Settings()
