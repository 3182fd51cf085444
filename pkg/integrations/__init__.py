# Identity registry, Schwarz-curve geometry and Belyi maps
