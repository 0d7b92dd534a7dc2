import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent
TESTS_DIR = BASE_DIR / 'tests'

LOG_LEVEL = os.getenv('TORSIONLAB_LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Worker pool
DEFAULT_WORKERS = int(os.getenv('TORSIONLAB_WORKERS', 1))

# Nil Hecke resource caps (ambient rank N = a + n + b)
NILHECKE_MAX_RANK = int(os.getenv('TORSIONLAB_NILHECKE_MAX_RANK', 8))
NILHECKE_PRUNED_MAX_RANK = int(os.getenv('TORSIONLAB_NILHECKE_PRUNED_MAX_RANK', 14))

# Factorization effort
FACTOR_FULL_BITS = int(os.getenv('TORSIONLAB_FACTOR_FULL_BITS', 96))
FACTOR_TRIAL_LIMIT = int(os.getenv('TORSIONLAB_FACTOR_TRIAL_LIMIT', 10 ** 6))

# Search settings
BEAM_WIDTH = int(os.getenv('TORSIONLAB_BEAM_WIDTH', 4000))
BEAM_RANDOM_RATE = float(os.getenv('TORSIONLAB_BEAM_RANDOM_RATE', 0.2))
SEARCH_GENERATION_SIZE = int(os.getenv('TORSIONLAB_SEARCH_GENERATION_SIZE', 1000))
SEARCH_ARCHIVE_WIDTH = int(os.getenv('TORSIONLAB_SEARCH_ARCHIVE_WIDTH', 1000))

# Semigroup enumeration
ZAREMBA_A = int(os.getenv('TORSIONLAB_ZAREMBA_A', 5))
ZAREMBA_THETA = os.getenv('TORSIONLAB_ZAREMBA_THETA', '1/2')
ZAREMBA_GROWTH_MAX_N = int(os.getenv('TORSIONLAB_ZAREMBA_GROWTH_MAX_N', 20000))

# Output schema version carried by every JSON document
SCHEMA_VERSION = 1
