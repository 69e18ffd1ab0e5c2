from django.conf import settings

DEFAULTS = {
    'DEFAULT_SEED': 271828182,
    'THREADS': 1,
    'BRUTE_FORCE_MAX_N': 8,
    'EVOLVE_MAX_N': 11,
    'BRUTE_FORCE_BLOCK': 1 << 18,
    'MC_BLOCK': 4096,
    'MC_MAX_WORK': 10 ** 10,
    'API_MAX_N': 200,
}


def lab_setting(name: str):
    """Read one key of ``settings.SHUFFLE_LAB``, falling back to the defaults"""
    if name not in DEFAULTS:
        raise KeyError(f"Unknown shuffle lab setting: {name}")
    if not settings.configured:
        return DEFAULTS[name]
    return getattr(settings, 'SHUFFLE_LAB', {}).get(name, DEFAULTS[name])
