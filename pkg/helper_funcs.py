import configparser
import json
import logging
import os
import sys

"""
author:
ccbench maintainers

.. description::
Small helpers used by more than one module: parameter file import, console progress bar and logging setup.
"""

repo_path = os.path.dirname(os.path.abspath(__file__))
default_pars_file = os.path.join(repo_path, "input", "pars_ccbench.ini")


# ----------------------------------------------------------------------------------------------------------------------
# PARAMETER IMPORT -----------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def import_pars(pars_file: str = default_pars_file) -> dict:
    """
    Reads an .ini parameter file whose option values are JSON and returns {section: {option: value}}. Section names
    are lowercased, e.g. [GRID_PARS] -> "grid_pars".
    """

    parser = configparser.ConfigParser()

    if not parser.read(pars_file):
        raise RuntimeError('Specified config file does not exist or is empty!')

    pars = {}

    for section in parser.sections():
        pars[section.lower()] = {}

        for option, raw_value in parser.items(section):
            try:
                pars[section.lower()][option] = json.loads(raw_value)
            except json.JSONDecodeError as exc:
                raise RuntimeError("Option %s in section %s is not valid JSON: %s" % (option, section, exc))

    return pars


# ----------------------------------------------------------------------------------------------------------------------
# CONSOLE OUTPUT -------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format="%(levelname)s: %(message)s",
                        stream=sys.stdout)


def progressbar(i: int, i_total: int, prefix: str = '', suffix: str = '', decimals: int = 1, length: int = 50) -> None:
    """Prints a progress bar into the console. i must run from 1 to i_total."""

    if i_total <= 0:
        return

    percent = ("{0:." + str(decimals) + "f}").format(100.0 * i / i_total)
    filled_length = int(length * i // i_total)
    bar = '#' * filled_length + '-' * (length - filled_length)

    sys.stdout.write('\r%s |%s| %s%% %s' % (prefix, bar, percent, suffix))

    if i >= i_total:
        sys.stdout.write('\n')

    sys.stdout.flush()
