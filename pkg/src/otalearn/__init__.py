"""Active learning of deterministic one-clock timed automata."""
