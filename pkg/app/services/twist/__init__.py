# Torus 2-cocycles and multiparametric deformations
