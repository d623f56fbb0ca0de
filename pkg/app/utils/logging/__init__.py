# Logging utilities for the qbundle engine
