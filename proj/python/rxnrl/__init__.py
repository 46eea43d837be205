"""Reaction-network generation, episodic environment and agents."""

from ._rxnrl import (
    ConfigError,
    Env,
    Network,
    SmilesError,
    State,
    canonicalize,
    fingerprint,
    shortest_path,
    tabular,
    train,
    write_smiles,
)

FRUCTOSE = "OCC(=O)C(O)C(O)C(O)CO"
HMF = "OCC1=CC=C(C=O)O1"
WATER = "O"
HYDRONIUM = "[OH3+]"

__all__ = [
    "ConfigError",
    "Env",
    "Network",
    "SmilesError",
    "State",
    "canonicalize",
    "fingerprint",
    "shortest_path",
    "tabular",
    "train",
    "write_smiles",
    "FRUCTOSE",
    "HMF",
    "WATER",
    "HYDRONIUM",
]
