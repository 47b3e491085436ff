"""Ratio of the Eisenstein and theta Whittaker coefficients at s = 1/2 for the first few a < 0."""
from cmkernel.verifier.checks import theta_eisenstein_data


def main(a_max=20):
    for D in (7, 23):
        print("D=%d" % D)
        for a, E, T in theta_eisenstein_data(D, a_max=a_max):
            ratio = "%.15g" % (E / T).real if abs(T) > 1e-300 else "-"
            print("  a=%-4s E=%-26.15g theta=%-26.15g E/theta=%s" % (a, complex(E).real, complex(T).real, ratio))


if __name__ == "__main__":
    main()
