import functools
import getpass
import logging
import os
import socket
import sys
import time
from pathlib import Path

import numpy as np

FORMAT = '%(asctime)s.%(msecs)03d{tz}|{hostname}|{user}|%(process)d|' \
         '%(levelname)s|%(filename)s|%(lineno)d|%(message)s'
DATEFMT = '%Y-%m-%dT%H:%M:%S'


class LoggingDecorator:
    """Configures the root logger before the decorated call

    Records go to standard error unless a file is given, so the report on
    standard output stays clean.

    Args:
        filename (str or Path): log file, standard error if None
        filemode (str): mode of log file
        fmt (str): format of messages, ``{tz}``, ``{hostname}`` and ``{user}``
            are filled once at configuration
            See https://docs.python.org/3/library/logging.html#logrecord-attributes
        datefmt (str): format of the date
        level (int or str): DEBUG, INFO, WARNING, ERROR or CRITICAL
    """

    def __init__(self, filename=None, filemode='a', fmt=FORMAT, datefmt=DATEFMT,
                 level='WARNING'):
        self.filename = None if filename is None else Path(filename).resolve()
        self.filemode = filemode
        self.fmt = fmt
        self.datefmt = datefmt
        self.level = level

    def configure(self):
        fmt = self.fmt.format(tz=time.strftime('%z'),
                              hostname=socket.gethostname(), user=_user())
        logging.basicConfig(filename=self.filename, filemode=self.filemode,
                            format=fmt, datefmt=self.datefmt,
                            level=self.level, force=True)
        from kahler_lab import __version__
        logging.info(f'kahler_lab {__version__}, numpy {np.__version__}, '
                     f'python {sys.version.split()[0]}')
        logging.info(f'pid {os.getpid()} in {os.getcwd()}')

    def __call__(self, f):
        @functools.wraps(f)
        def wrapper(*args, **kwargs):
            self.configure()
            return f(*args, **kwargs)

        return wrapper


def _user():
    try:
        return getpass.getuser()
    except Exception:  # no login name in some containers
        return 'unknown'


def timeit(f):
    """Logs wall time of a call of a function or a callable instance"""
    name = getattr(f, '__qualname__', type(f).__qualname__)

    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        out = f(*args, **kwargs)
        logging.info(f'{f.__module__}.{name} - {time.perf_counter() - t:.3f}s')
        return out

    return wrapper
