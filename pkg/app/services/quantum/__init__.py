# Presented quantum groups, Hopf structure maps and localizations
