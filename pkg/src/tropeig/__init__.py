"""Min-plus spectral asymptotics of perturbed matrices."""
