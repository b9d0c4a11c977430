# Kernel and Ntilde reference values at 40 digits.
import mpmath as mp

mp.mp.dps = 40


def blocks(z, zp, side, x):
    s = z + zp
    ka = (s + 1) / 2 if side > 0 else (1 - s) / 2
    mu = (z - zp) / 2
    wa = mp.whitw(ka, mu, x)
    wb = mp.whitw(ka - 1, mu, x)
    return wa, wb


def kernel(z, zp, x, y):
    t = z * zp
    cpp = 1 / (mp.gamma(z) * mp.gamma(zp))
    cmm = 1 / (mp.gamma(-z) * mp.gamma(-zp))
    coff = mp.sqrt(mp.sinpi(z) * mp.sinpi(zp)) / mp.pi
    ax, bx = [w / mp.sqrt(abs(x)) for w in blocks(z, zp, 1 if x > 0 else -1, abs(x))]
    ay, by = [w / mp.sqrt(abs(y)) for w in blocks(z, zp, 1 if y > 0 else -1, abs(y))]
    if x > 0 and y > 0:
        return cpp * (ax * by - bx * ay) / (x - y)
    if x < 0 and y < 0:
        return cmm * (ax * by - bx * ay) / (abs(x) - abs(y))
    if x > 0:
        return coff * (ax * ay + t * bx * by) / (x + abs(y))
    return -coff * (ay * ax + t * by * bx) / (abs(x) + y)


def kernel_diag(z, zp, x):
    side = 1 if x > 0 else -1
    pref = 1 / (mp.gamma(z) * mp.gamma(zp)) if x > 0 else 1 / (mp.gamma(-z) * mp.gamma(-zp))
    u = abs(x)
    f = lambda v: [w / mp.sqrt(v) for w in blocks(z, zp, side, v)]
    a, b = f(u)
    da = mp.diff(lambda v: f(v)[0], u)
    db = mp.diff(lambda v: f(v)[1], u)
    return pref * (da * b - a * db)


def gauge(z, zp, u):
    s = (z + zp) / 2
    g = abs(u) ** s * mp.exp(-u / 2)
    return g if u > 0 else g * mp.pi / mp.sqrt(mp.sinpi(z) * mp.sinpi(zp))


params = [(-0.3, -0.6), (0.4, 0.7), (1.2, 1.5), (-1.7, -1.25)]
points = [(1.0, 2.0), (2.0, 1.0), (1.0, -2.0), (-2.0, 1.0), (-1.5, -0.5), (0.7, -0.7), (3.5, 0.25)]
diags = [0.5, 1.0, 4.0, -0.5, -3.0]

with open("kernel_table.inc", "w") as out:
    out.write("// z, z', x, y, K(x,y), Ntilde(x,y)\n")
    for z, zp in params:
        z, zp = mp.mpf(z), mp.mpf(zp)
        for x, y in points:
            k = kernel(z, zp, mp.mpf(x), mp.mpf(y))
            n = gauge(z, zp, mp.mpf(x)) / gauge(z, zp, mp.mpf(y)) * k
            out.write("{%s, %s, %s, %s, %s, %s},\n" % (
                mp.nstr(z, 17), mp.nstr(zp, 17), x, y, mp.nstr(k, 20), mp.nstr(n, 20)))
with open("kernel_diag_table.inc", "w") as out:
    out.write("// z, z', x, K(x,x)\n")
    for z, zp in params:
        z, zp = mp.mpf(z), mp.mpf(zp)
        for x in diags:
            out.write("{%s, %s, %s, %s},\n" % (
                mp.nstr(z, 17), mp.nstr(zp, 17), x, mp.nstr(kernel_diag(z, zp, mp.mpf(x)), 20)))
