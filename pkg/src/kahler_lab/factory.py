from importlib import import_module
from pathlib import Path

from kahler_lab.load import load

# prefix -> module with a str2obj registry
REGISTRIES = {
    'ambient': 'kahler_lab.ambient.ambient',
    'mode': 'kahler_lab.classify.classify',
    'generate': 'kahler_lab.generate.generate',
    'suite': 'kahler_lab.selftest.selftest',
}

SUFFIXES = ('.yml', '.yaml', '.json')


class FactoryError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return str(self.value)


class FactoryClassError(FactoryError):
    """Mapping without a ``class`` key"""


class FactoryKeyError(FactoryError):
    """Unregistered name"""


class FactoryValueError(FactoryError):
    """Object that is neither a name, a mapping, a list nor a file"""


class Factory:
    """Builds registered objects from names, mappings, lists or files

    Names are ``prefix.name``, e.g. ``mode.semiparallel`` or
    ``ambient.product``, with prefixes from ``REGISTRIES``.

    Examples:
        >>> FACTORY('mode.semiparallel')
        >>> FACTORY({'class': 'ambient.product', 'n': 3, 'k': 1, 'mu': 2.})
        >>> FACTORY(['ambient.constant_hsc', 2, 1.])
    """

    def __init__(self, registries=None):
        registries = REGISTRIES if registries is None else registries
        self.str2obj, self.obj2str = {}, {}
        for prefix, module in registries.items():
            for name, obj in import_module(module).str2obj.items():
                key = f'{prefix}.{name}'
                if key in self.str2obj:
                    raise ValueError(f'Duplicate keys: {key}')
                self.str2obj[key] = obj
                self.obj2str.setdefault(obj, []).append(key)

    def keys(self, prefix):
        """Names registered under a prefix, without the prefix"""
        head = f'{prefix}.'
        return [k[len(head):] for k in self.str2obj if k.startswith(head)]

    def __call__(self, obj):
        key, args, kwargs = self.unpack(obj)
        if not isinstance(key, str) or key not in self.str2obj:
            raise FactoryKeyError(key)
        return self.str2obj[key](*args, **kwargs)

    @staticmethod
    def unpack(obj):
        """Split obj into registry key, positional and keyword arguments"""
        if isinstance(obj, str) and Path(obj).suffix in SUFFIXES and Path(obj).is_file():
            obj = load(Path(obj))
        if isinstance(obj, dict):
            if 'class' not in obj:
                raise FactoryClassError(obj)
            kwargs = {k: v for k, v in obj.items() if k != 'class'}
            return obj['class'], [], kwargs
        if isinstance(obj, list) and len(obj) > 1:
            return obj[0], obj[1:], {}
        if isinstance(obj, str):
            return obj, [], {}
        raise FactoryValueError(obj)


FACTORY = Factory()
