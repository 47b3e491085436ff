"""Print both sides of the height generating series for D = 7, m = 3 and D = 23 with a cubic character."""
from cmkernel.kernel import KernelParams
from cmkernel.quaternion import build_algebra, generating_series_terms


def main(a_max=12):
    for P in (KernelParams(7, 3), KernelParams(23, 5, ks=[1])):
        S = build_algebra(P)
        print("D=%d m=%d chi=%s ramification=%s" % (P.D, P.m, P.chi.ks,
                                                    sorted(map(str, S.ramification()))))
        print("%4s %28s %28s %10s" % ("a", "kernel side", "height side", "route_err"))
        for a in range(1, a_max + 1):
            r = generating_series_terms(P, a, S)
            print("%4d %28s %28s %10.2e" % (a, "%.15g" % complex(r["lhs"]).real,
                                           "%.15g" % complex(r["rhs"]).real, r["route_err"]))


if __name__ == "__main__":
    main()
