import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    # Cache settings
    CACHE_DIR = os.getenv('PQCOVERS_CACHE_DIR', '.pqcovers_cache')

    # Search bounds
    SEARCH_BOUND = int(os.getenv('PQCOVERS_SEARCH_BOUND', str(10**8)))
    AUT_SEARCH_BOUND = int(os.getenv('PQCOVERS_AUT_BOUND', '500'))
    ASSOC_CHECK_BOUND = int(os.getenv('PQCOVERS_ASSOC_BOUND', '200'))

    # Numerical verification
    SAMPLE_COUNT = int(os.getenv('PQCOVERS_SAMPLES', '100'))
    RANDOM_SEED = int(os.getenv('PQCOVERS_SEED', '0'))
    TOLERANCE = float(os.getenv('PQCOVERS_TOLERANCE', '1e-9'))
    LAMBDA_TOLERANCE = float(os.getenv('PQCOVERS_LAMBDA_TOLERANCE', '1e-12'))

    # Sweep parallelism
    WORKERS = int(os.getenv('PQCOVERS_WORKERS', '1'))

    # MinIO/S3 cache mirror (optional)
    CACHE_S3_ENDPOINT_URL = os.getenv('CACHE_S3_ENDPOINT_URL', 'http://localhost:9000')
    CACHE_S3_ACCESS_KEY = os.getenv('CACHE_S3_ACCESS_KEY', 'minioadmin')
    CACHE_S3_SECRET_KEY = os.getenv('CACHE_S3_SECRET_KEY', 'minioadmin')
    CACHE_S3_BUCKET = os.getenv('CACHE_S3_BUCKET', '')

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
