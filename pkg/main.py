"""
divsmooth - smoothed classical divergences and their optimal universal bounds.
Entry point for the command-line tool.
"""

import sys

from src.cli import run
from src.config import install_signal_handlers, logger, _
from src.utils.cache import close_cache

if __name__ == "__main__":
    install_signal_handlers()
    try:
        code = run(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info(_("Exiting..."))
        code = 1
    except Exception as e:
        logger.error(_("Unexpected error: {}").format(e))
        code = 1
    finally:
        close_cache()
    exit(code)
