from toric.documents import dump_complex, report
from toric.exceptions import NotWlc
from toric.logpair import (
    check_preconditions,
    lc_centers,
    lcs_locus,
    minimal_lc_center,
    require_wlc,
    solve_psi,
)
from toric.residue import different

from ._pipeline import PipelineCommand, add_reduced_boundary_argument


class Command(PipelineCommand):
    help = "lc centers, the minimal lc center, the LCS locus and the differents on it."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_reduced_boundary_argument(parser)

    def run(self, document, mc, options):
        mc = check_preconditions(mc, options["box"])
        boundary = self.boundary(document, mc, options)
        psi = solve_psi(mc, boundary).psi
        centers = lc_centers(mc, boundary, psi)
        section = {"lc_centers": [mc.name(c) for c in centers]}

        try:
            require_wlc(mc, boundary, psi)
        except NotWlc as exc:
            section["wlc"] = {"value": False, "reason": exc.message}
            return report(document, centers=section)
        section["wlc"] = {"value": True}
        minimal = minimal_lc_center(mc, boundary, psi)
        section["minimal_lc_center"] = {"cone": mc.name(minimal.cone), "certificate": minimal.certificate}

        locus = lcs_locus(mc, boundary, psi)
        section["lcs"] = dict(locus.report)
        if locus.complex is not None:
            section["lcs"]["complex"] = dump_complex(locus.complex)
            section["differents"] = [
                different(mc, boundary, psi, tau).as_dict(mc) for tau in locus.complex.facets
            ]
        return report(document, centers=section)
