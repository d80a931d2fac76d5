"""
Layered configuration lookups with helpful errors.
"""


class FriendlyConfig:
    """
    Read-only view over several mappings, searched in order.

    Missing keys raise a KeyError that says how to provide the key.
    """

    def __init__(self, *parents, source="the config file"):
        self._parents = parents
        self._source = source

    def __getitem__(self, key):
        self._validate_key_type(key)
        for parent in self._parents:
            if key in parent:
                return parent[key]
        raise KeyError(
            f"{key!r}: this key is required; add a line `{key} = <value>` to {self._source}."
        ) from None

    def __contains__(self, key):
        self._validate_key_type(key)
        return any(key in parent for parent in self._parents)

    def get(self, key, missing_val=None):
        """
        Optional access to a key.
        """
        self._validate_key_type(key)
        for parent in self._parents:
            if key in parent:
                return parent[key]
        return missing_val

    def keys(self):
        """
        Every key available from any layer, sorted.
        """
        return sorted({key for parent in self._parents for key in parent})

    @staticmethod
    def _validate_key_type(key):
        if not isinstance(key, str):
            raise TypeError(f"str expected, not {type(key)}")
