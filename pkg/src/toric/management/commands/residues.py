from toric.documents import report
from toric.logpair import check_preconditions, lcs_locus, solve_psi
from toric.residue import higher_residue, lcs_different, lcs_glue_check, residue_constants

from ._pipeline import PipelineCommand, add_r_argument, add_reduced_boundary_argument


class Command(PipelineCommand):
    help = "Residue constants, the LCS gluing check and induced boundaries."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_r_argument(parser)
        add_reduced_boundary_argument(parser)
        parser.add_argument("--center", default=None, help="lc center Z (cone id or alias) for the higher residue")

    def run(self, document, mc, options):
        mc = check_preconditions(mc, options["box"])
        boundary = self.boundary(document, mc, options)
        psi = solve_psi(mc, boundary).psi
        r = options["r"]

        section = {"residue_constants": residue_constants(mc, boundary, psi, r).as_dict(mc)}
        if lcs_locus(mc, boundary, psi).complex is not None:
            glue = lcs_glue_check(mc, boundary, psi, r)
            section["glue_check"] = glue.as_dict()
            if glue:
                section["lcs_different"] = lcs_different(mc, boundary, psi, r).as_dict()
        if options["center"] is not None:
            section["higher_residue"] = higher_residue(mc, boundary, psi, options["center"], r).as_dict(mc)
        return report(document, residues=section)
