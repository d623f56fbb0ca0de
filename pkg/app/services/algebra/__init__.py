# Exact coefficient arithmetic, free algebras and rewriting
