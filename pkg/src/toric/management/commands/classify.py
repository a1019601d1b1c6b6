from toric.documents import report
from toric.exceptions import DocumentError
from toric.logpair import classify
from toric.normality import normality_report

from ._pipeline import PipelineCommand, add_r_argument


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise DocumentError(f"--evaluate expects comma separated integers, got {text!r}", field="evaluate") from exc


class Command(PipelineCommand):
    help = "Normality and log pair classification of a complex with its boundary."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_r_argument(parser)
        parser.add_argument("--nmax", type=int, default=None, help="largest n tried for invertibility")
        parser.add_argument(
            "--evaluate", action="append", default=[], metavar="E",
            help="primitive vector e, e.g. 1,0; reports <e, psi>",
        )

    def run(self, document, mc, options):
        normality = normality_report(mc, options["box"])
        boundary = self.boundary(document, mc, options)
        result = classify(
            mc, boundary,
            n_max=options["nmax"],
            evaluations=[_vector(e) for e in options["evaluate"]],
            box=options["box"],
        )
        lattice = mc.as_lattice_family()
        data = result.as_dict(lattice)
        if options["r"] is not None:
            data["r_invertible"] = options["r"] in result.invertibility_orders
        return report(document, normality=normality.as_dict(), classification=data)
