"""Torus average of the Eisenstein series at CM points against the Hecke L-value."""
from cmkernel.cmfield import CMField, HeckeCharacter, ray_class_group
from cmkernel.eisenstein_cm import verify_cm_identity


def main():
    for D, ks, tau in ((7, None, 2.0), (23, [1], 1.5), (23, [2], 1.8), (47, [1], 2.0)):
        chi = HeckeCharacter(ray_class_group(CMField(D), 1), ks)
        r = verify_cm_identity(chi, tau)
        print("D=%-3d chi=%-6s tau=%.1f  lhs=%.15g  rhs=%.15g  abs_err=%.2e  tail=%.2e"
              % (D, ks, tau, complex(r["lhs"]).real, complex(r["rhs"]).real, r["abs_err"], r["tail_bound"]))


if __name__ == "__main__":
    main()
