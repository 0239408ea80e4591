"""Configuration constants and defaults for RIS-OFDM simulations."""

from typing import Any, Dict, List

# Euler-Mascheroni constant
EULER_GAMMA = 0.5772156649015329

# Defaults in the units a config file uses (dB, dBm, meters)
DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    'system': {
        'num_subcarriers': 128,
        'cp_length': 8,
        'num_elements': 100,
    },
    'channel': {
        'taps_direct': 3,
        'taps_ap_ris': 1,
        'taps_ris_ue': 5,
        'rician_direct_db': 0.0,
        'rician_ap_ris_db': 5.0,
        'rician_ris_ue_db': 3.0,
        'pathloss_direct': 3.5,
        'pathloss_ap_ris': 2.2,
        'pathloss_ris_ue': 2.8,
        'reference_loss_db': -30.0,
    },
    'geometry': {
        'ap_height': 10.0,
        'ris_height': 10.0,
        'ap_ris_horizontal': 50.0,
        'ue_height': 0.0,           # UE on the ground, directly below the RIS
        'element_spacing': 0.125,   # wavelengths; recorded only
        'elements_per_row': 10,     # recorded only
    },
    'power': {
        'downlink_dbm': 10.0,
        'uplink_pilot_dbm': 0.0,
        'noise_ap_dbm': -100.0,
        'noise_ue_dbm': -90.0,
    },
    'optimization': {
        'ao_iterations': 3,
        'ao_update': 'gradient',    # 'gradient', 'power' or 'search'
        'ao_search_points': 64,
        'ao_candidates': 128,      # starting points screened by water-filled rate
        'ao_starts': 8,            # best screened points refined by element sweeps
        'truncate_separate': True,
        'pilot_seed': 20210901,
    },
    'simulation': {
        'seed': 1,
        'trials': 500,
        'workers': 1,
    },
}

# Config files looked up in the working directory when no path is given
CONFIG_FILE_NAMES: List[str] = [
    'risofdm.json',
    '.risofdm.json',
    'risofdm.yaml',
    'risofdm.yml',
    '.risofdm.yaml',
    '.risofdm.yml',
]

AO_UPDATE_RULES = ('gradient', 'power', 'search')
AO_START_SEED = 20211103

SCHEMES = ('proposed', 'ao-perfect-csi', 'ao-estimated-csi', 'random-phase')
AXES = ('Q', 'M', 'T', 'P_UL')

# Sweep axes each scheme can move along
SCHEME_AXES: Dict[str, tuple] = {
    'proposed': ('Q', 'M', 'T', 'P_UL'),
    'random-phase': ('M', 'T', 'P_UL'),
    'ao-perfect-csi': ('M', 'T'),
    'ao-estimated-csi': ('M', 'T', 'P_UL'),
}

RESULT_HEADER: List[str] = [
    'scenario', 'axis', 'axis_value', 'mean_rate', 'stderr',
    'effective_rate', 'bound', 'complexity', 'trials', 'seed',
]

BOUND_HEADER: List[str] = [
    'q', 'harmonic', 'gain_harmonic', 'gain_asymptotic', 'rate_harmonic', 'rate_asymptotic',
]

COMPLEXITY_HEADER: List[str] = [
    'm', 'q', 'conventional_estimation', 'proposed_estimation',
    'ao_optimization', 'proposed_optimization',
]

TRIALS_RATE_CURVES = 500
TRIALS_BOUND_CHECK = 10000

# Sweep grids
RATE_CURVE_Q_VALUES = [1, 2, 5, 10, 20, 50, 100, 200]
COHERENCE_T_VALUES = [25, 50, 100, 150, 200, 300, 400, 500]
COMPLEXITY_M_VALUES = [50, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000]
COMPLEXITY_Q_VALUES = [10, 50, 100]
BOUND_Q_VALUES = [10, 20, 50, 100, 200]
RECOMMEND_Q_CANDIDATES = [1, 2, 5, 10, 15, 20, 30, 40, 50]

# Named scenario grids for `sweep --preset`. Each entry: scheme, axis, values and
# the config overrides the scenario runs under.
PRESETS: Dict[str, List[Dict[str, Any]]] = {
    'rate-vs-q': [
        {'name': f'rate-vs-q-m{m}', 'scheme': 'proposed', 'axis': 'Q', 'values': RATE_CURVE_Q_VALUES,
         'noise': False, 'overrides': {'system.num_elements': m}}
        for m in (100, 200, 500, 1000)
    ],
    'pilot-power': [
        entry
        for p_ul in (0.0, -5.0, -10.0)
        for entry in (
            {'name': f'pilot-power-proposed-{p_ul:g}dbm', 'scheme': 'proposed', 'axis': 'Q',
             'values': RATE_CURVE_Q_VALUES, 'overrides': {'power.uplink_pilot_dbm': p_ul}},
            {'name': f'pilot-power-ao-est-{p_ul:g}dbm', 'scheme': 'ao-estimated-csi', 'axis': 'M',
             'values': [100], 'overrides': {'power.uplink_pilot_dbm': p_ul}},
        )
    ] + [
        {'name': 'pilot-power-ao-perfect', 'scheme': 'ao-perfect-csi', 'axis': 'M', 'values': [100]},
        {'name': 'pilot-power-random', 'scheme': 'random-phase', 'axis': 'M', 'values': [100]},
    ],
    'coherence': [
        {'name': f'coherence-proposed-q{q}', 'scheme': 'proposed', 'axis': 'T', 'q': q,
         'values': COHERENCE_T_VALUES, 'overrides': {'power.uplink_pilot_dbm': -5.0}}
        for q in (5, 10, 20, 50)
    ] + [
        {'name': 'coherence-ao-est', 'scheme': 'ao-estimated-csi', 'axis': 'T',
         'values': COHERENCE_T_VALUES, 'overrides': {'power.uplink_pilot_dbm': -5.0}},
        {'name': 'coherence-random', 'scheme': 'random-phase', 'axis': 'T',
         'values': COHERENCE_T_VALUES, 'overrides': {'power.uplink_pilot_dbm': -5.0}},
    ],
    'bound-check': [
        {'name': f'bound-check-m{m}', 'scheme': 'proposed', 'axis': 'Q', 'values': BOUND_Q_VALUES,
         'noise': False, 'trials': TRIALS_BOUND_CHECK,
         'overrides': {'system.num_elements': m, 'channel.rician_ap_ris_db': 30.0,
                       'channel.rician_ris_ue_db': 30.0}}
        for m in (100, 500)
    ],
}
