# Sheaf model and cleaving maps of the quantum principal bundle
