from acm_towers._version import __version__
