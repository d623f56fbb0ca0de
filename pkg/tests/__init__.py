# Test package for the qbundle engine
