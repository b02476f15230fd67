import re
import sys
import json
from pathlib import Path

import yaml


class Loader(yaml.SafeLoader):
    """Safe loader that also reads exponent floats without a dot, e.g. 1e-8"""


Loader.add_implicit_resolver(
    'tag:yaml.org,2002:float',
    re.compile(r'''^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                   |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                   |[-+]?\.[0-9_]+(?:[eE][-+]?[0-9]+)?
                   |[-+]?[0-9][0-9_]*(?::[0-5]?[0-9])+\.[0-9_]*
                   |[-+]?\.(?:inf|Inf|INF)
                   |\.(?:nan|NaN|NAN))$''', re.X),
    list('-+0123456789.'))


def read_text(path):
    """Text of a file, standard input for "-" """
    if str(path) == '-':
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def loads(text, suffix='.yaml'):
    if suffix == '.json':
        return json.loads(text)
    elif suffix in ['.yml', '.yaml']:
        return yaml.load(text, Loader=Loader)
    else:
        raise ValueError(f"Wrong file format {suffix}!")


def load(path):
    """Data of a .json/.yml/.yaml file, YAML (a superset of JSON) for "-" """
    path = Path(path)
    suffix = '.yaml' if str(path) == '-' else path.suffix
    return loads(read_text(path), suffix)


def dumps(data, suffix='.yaml'):
    if suffix == '.json':
        return json.dumps(data, indent=2) + '\n'
    elif suffix in ['.yml', '.yaml']:
        return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
    else:
        raise ValueError(f"Wrong file format {suffix}!")


def dump(data, path):
    """Write data to a .json/.yml/.yaml file, YAML to standard output for "-" """
    path = Path(path)
    if str(path) == '-':
        sys.stdout.write(dumps(data))
        return
    with open(path, 'w') as f:
        f.write(dumps(data, path.suffix))
