"""Built-in example functions and the annuli they are sampled on."""

from math import pi

from .grid import Domain

TWO_PI = 2 * pi

# tau^3 + tau has f' = 0 at |tau| = 1/sqrt(3); its annulus stays outside that circle.
CATALOG = {
    "tau^2": Domain(0.5, 2.0, 0.0, TWO_PI, 64, 64),
    "log(tau)": Domain(0.5, 2.0, 0.0, TWO_PI, 64, 64),
    "exp(tau)": Domain(0.5, 2.0, 0.0, TWO_PI, 64, 64),
    "tau^3+tau": Domain(1.0, 2.0, 0.0, TWO_PI, 64, 64),
}

# gallery turns: log(tau) is drawn on two sheets of its Riemann surface
GALLERY_TURNS = {"log(tau)": 2}

GALLERY_NAMES = {
    "tau^2": "catenoid_cousin",
    "log(tau)": "ruled",
    "exp(tau)": "exp",
    "tau^3+tau": "cubic",
}


def gallery_domain(expression, n_r=128, n_theta=128):
    base = CATALOG[expression]
    turns = GALLERY_TURNS.get(expression, 1)
    return Domain(base.r_min, base.r_max, 0.0, turns * TWO_PI, n_r, turns * n_theta)
