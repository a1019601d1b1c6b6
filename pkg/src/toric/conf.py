from django.conf import settings

DEFAULTS = {
    "DEFAULT_BOX": None,
    "NMAX": 12,
    "R": 2,
    "SCHEMA_VERSION": 1,
    "SEARCH_LIMIT": 200_000,
}


def get_setting(name: str):
    """Read ``settings.TORIC[name]``, falling back to the library default."""
    overrides = getattr(settings, "TORIC", {}) if settings.configured else {}
    if name in overrides:
        return overrides[name]
    return DEFAULTS[name]
