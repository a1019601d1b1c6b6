from django.core.management.base import BaseCommand, CommandError

from toric.documents import dump_complex, dumps
from toric.exceptions import ToricError
from toric.mcomplex import coordinate_arrangement, cusp_cone, stanley_reisner

KINDS = ("coordinate-arrangement", "stanley-reisner", "cusp-cone")


def _faces(text: str) -> list[list[int]]:
    """'1,2,3;3,4,5' -> [[1, 2, 3], [3, 4, 5]]"""
    try:
        return [[int(v) for v in part.split(",")] for part in text.split(";") if part.strip()]
    except ValueError as exc:
        raise CommandError(f"cannot read facets from {text!r}", returncode=2) from exc


class Command(BaseCommand):
    help = "Print a complex document for one of the standard families."

    def add_arguments(self, parser):
        parser.add_argument("kind", choices=KINDS)
        parser.add_argument("params", nargs="*", help="n p | facets like 1,2,3;3,4,5 | nothing")
        parser.add_argument("--char", type=int, default=0)
        parser.add_argument("--vertices", type=int, default=None, help="vertex count for stanley-reisner")

    def handle(self, *args, **options):
        kind, params = options["kind"], options["params"]
        try:
            if kind == "coordinate-arrangement":
                if len(params) != 2:
                    raise CommandError("coordinate-arrangement takes n and p", returncode=2)
                n, p = (int(x) for x in params)
                mc = coordinate_arrangement(n, p, options["char"])
            elif kind == "stanley-reisner":
                if len(params) != 1:
                    raise CommandError("stanley-reisner takes one facet list", returncode=2)
                facets = _faces(params[0])
                vertices = options["vertices"] or max(v for f in facets for v in f)
                mc = stanley_reisner(vertices, facets, options["char"])
            else:
                mc = cusp_cone(options["char"])
        except ValueError as exc:
            raise CommandError(str(exc), returncode=2) from exc
        except ToricError as exc:
            raise CommandError(exc.message, returncode=exc.exit_code) from exc
        self.stdout.write(dumps(dump_complex(mc)), ending="")
