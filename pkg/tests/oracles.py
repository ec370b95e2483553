"""Reference computations written from the model equations with plain ``math``.

Nothing here imports from ``uavlink``: these exist to cross-check it.
"""

import math

A, B, C = 0.3, 500.0, 15.0
G_LOS = 10 ** (-32.9 / 10)
G_NLOS = 10 ** (-41.1 / 10)
ALPHA_LOS, ALPHA_NLOS = 2.09, 3.75


def los_prob(h_bs, h_uav, r):
    m = math.floor(r * math.sqrt(A * B) / 1000 - 1)
    p = 1.0
    for n in range(m + 1):
        h = h_bs - (n + 0.5) * (h_bs - h_uav) / (m + 1)
        p *= 1 - math.exp(-h * h / (2 * C * C))
    return p


def rx_power(bs_xy, h_bs, uav_xy, h_uav, p_tx, tilt, width, g_m, g_s, g_r):
    r = math.dist(bs_xy, uav_xy)
    d = math.sqrt(r * r + (h_uav - h_bs) ** 2)
    lower = h_bs - r * math.tan(math.radians(tilt + width / 2))
    upper = h_bs - r * math.tan(math.radians(tilt - width / 2))
    g_t = g_m if lower < h_uav < upper else g_s
    p = los_prob(h_bs, h_uav, r)
    g_c = p * G_LOS * d ** (-ALPHA_LOS) + (1 - p) * G_NLOS * d ** (-ALPHA_NLOS)
    return p_tx * g_t * g_r * g_c, d


def sinr_drop(bs_list, uav_xy, h_uav, noise, policy, h_bs=30.0, p_tx=10 ** -0.6,
              tilt=8.0, width=30.0, g_m=10.0, g_s=0.5, g_r=29000 / 180**2):
    """SINR of one drop by exhaustive summation over every BS."""
    powers, dists = [], []
    for xy in bs_list:
        pw, d = rx_power(xy, h_bs, uav_xy, h_uav, p_tx, tilt, width, g_m, g_s, g_r)
        powers.append(pw)
        dists.append(d)
    if policy == "closest":
        serving = min(range(len(dists)), key=lambda i: (dists[i], i))
    else:
        serving = min(range(len(powers)), key=lambda i: (-powers[i], i))
    interference = 0.0
    for i, pw in enumerate(powers):
        if i != serving:
            interference += pw
    return powers[serving] / (interference + noise), serving


def golden_section_min(f, lo, hi, tol=1e-9):
    phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
    return (a + b) / 2
