import typing


T_JSON_DICT = typing.Dict[str, typing.Any]
_recipe_parsers: typing.Dict[str, typing.Any] = dict()


def recipe_kind(kind):
    ''' A decorator that registers a class as the parameter block of a recipe
    kind. '''
    def decorate(cls):
        _recipe_parsers[kind] = cls
        return cls
    return decorate


def recipe_kinds() -> typing.List[str]:
    ''' Names of all registered recipe kinds, sorted. '''
    return sorted(_recipe_parsers)


def parse_json_params(kind: str, json: T_JSON_DICT) -> typing.Any:
    ''' Parse a JSON dictionary into the parameter block for ``kind``. '''
    return _recipe_parsers[kind].from_json(json)
