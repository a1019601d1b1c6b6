from toric.documents import report
from toric.logpair import check_preconditions
from toric.residue import lcs_chain

from ._pipeline import PipelineCommand, add_r_argument, add_reduced_boundary_argument


class Command(PipelineCommand):
    help = "Walk the chain of LCS loci X ⊃ LCS(X) ⊃ ... with induced boundaries."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_r_argument(parser)
        add_reduced_boundary_argument(parser)

    def run(self, document, mc, options):
        mc = check_preconditions(mc, options["box"])
        steps = lcs_chain(mc, self.boundary(document, mc, options), options["r"])
        return report(document, chain=[step.as_dict() for step in steps])
