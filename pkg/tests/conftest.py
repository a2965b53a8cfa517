import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

# Fixed, reproducible example generation for every property test.
settings.register_profile("fixed", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fixed")
