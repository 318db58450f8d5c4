"""Configuration from the environment and ``.env`` files."""

import json
import os
import typing

import attrs
import cattrs
from dotenv import load_dotenv
from logzero import logger

# Load environment
env = os.environ
load_dotenv()

#: Version of the JSON report and input schemas.
SCHEMA_VERSION = "1"
#: Default seed for the random instance generators.
DEFAULT_SEED = int(env.get("ACM_TOWERS_SEED", "1"))
#: Default number of worker processes for the Betti number computation.
DEFAULT_THREADS = int(env.get("ACM_TOWERS_THREADS", "1"))
#: Maximal number of generators for the Taylor complex oracle.
MAX_TAYLOR_GENERATORS = int(env.get("ACM_TOWERS_MAX_TAYLOR_GENERATORS", "16"))
#: Maximal number of points for the generalized tower set decomposition search.
MAX_GTS_POINTS = int(env.get("ACM_TOWERS_MAX_GTS_POINTS", "14"))
#: Maximal number of symbols permuted by the towerizability searches.
MAX_SEARCH_SYMBOLS = int(env.get("ACM_TOWERS_MAX_SEARCH_SYMBOLS", "9"))
#: Maximal number of support members oriented by the towerizability searches.
MAX_SEARCH_MEMBERS = int(env.get("ACM_TOWERS_MAX_SEARCH_MEMBERS", "12"))


@attrs.frozen(auto_attribs=True)
class SearchCaps:
    """Size caps for the exhaustive searches"""

    #: Generator cap of the Taylor complex oracle
    taylor_generators: int = MAX_TAYLOR_GENERATORS
    #: Point cap of ``find_gts_decomposition``
    gts_points: int = MAX_GTS_POINTS
    #: Symbol cap of the towerizability searches
    search_symbols: int = MAX_SEARCH_SYMBOLS
    #: Member cap of the towerizability searches
    search_members: int = MAX_SEARCH_MEMBERS


def load_search_caps(path_caps: typing.Optional[str]) -> SearchCaps:
    if path_caps:
        logger.info("Loading search caps from %s...", path_caps)
        with open(path_caps, "rt") as inputf:
            caps_dict = json.load(inputf)
        logger.info("... done loading search caps")
    else:
        logger.debug("Using default search caps")
        caps_dict = {}

    return cattrs.structure(caps_dict, SearchCaps)
