# Gamma reference values at 30 digits.
import mpmath as mp

mp.mp.dps = 30
xs = ["-29.5", "-7.3", "-2.5", "-0.6", "-0.3", "0.001", "0.5", "1.7", "3.25", "10.1", "17.9", "29.99"]
with open("gamma_table.inc", "w") as out:
    out.write("// x, Gamma(x)\n")
    for x in xs:
        out.write("{%s, %s},\n" % (x, mp.nstr(mp.gamma(mp.mpf(x)), 20)))
