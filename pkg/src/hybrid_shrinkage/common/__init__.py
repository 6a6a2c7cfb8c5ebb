"""Package for general common components."""
