"""Configuration module for divsmooth: logging, messages, tolerances and environment."""

import gettext
import logging
import os
import signal
import threading

# Logs go to stderr; documents own stdout
logger = logging.getLogger()
logger.setLevel("INFO")
_handler = logging.StreamHandler()
_handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(message)s", "%Y-%m-%d %H:%M:%S"))
logger.addHandler(_handler)

LOCALE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "locale")
_ = gettext.translation("divsmooth", LOCALE_DIR, languages=[os.environ.get("DIVSMOOTH_LANG", "en_US")],
                        fallback=True).gettext

# Numeric tolerances
TOL_NORM = 1e-9  # probability vector validation
ORDER_SLACK = 1e-12  # order comparisons on derived reals
HINGE_SLACK = 1e-10  # hinge-curve dominance
LP_TOL = 1e-8  # LP feasibility
ORACLE_TOL = 1e-4  # closed form vs brute-force oracle

SCHEMA = "divsmooth/1"

# Set on SIGINT/SIGTERM; sweep workers stop evaluating once it is set
stop_event = threading.Event()


def get_thread_count() -> int:
    """Number of sweep workers, capped by DIVSMOOTH_THREADS."""
    default = os.cpu_count() or 1
    raw = os.environ.get("DIVSMOOTH_THREADS", "")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(_("Ignoring invalid DIVSMOOTH_THREADS value: {}").format(raw))
        return default
    return max(1, value)


def get_cache_dir() -> str | None:
    """Directory for the memoization cache; None means a temporary directory."""
    return os.environ.get("DIVSMOOTH_CACHE") or None


def handle_sigterm(*args):
    """Handle SIGTERM and SIGINT signals."""
    stop_event.set()
    raise KeyboardInterrupt()


def install_signal_handlers():
    """Register signal handlers for the command-line process."""
    signal.signal(signal.SIGTERM, handle_sigterm)
    signal.signal(signal.SIGINT, handle_sigterm)
