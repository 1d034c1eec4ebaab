"""Smith ideals, augmented algebras and their chain-level checks."""
