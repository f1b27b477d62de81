"""System F syntactic data types: terms, typing systems, probes and storage operators."""
