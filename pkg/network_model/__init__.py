from .ar1 import Ar1State, apply_jitter, ar1_path, ar1_step, carry_over_or_reset, jitter_factor
from .institutions import (CityHubLatency, HopSpec, Institution, InstitutionSet, default_institutions, hop_specs,
                           sample_institution)
from .routes import geographic_component, npp_route_latency
