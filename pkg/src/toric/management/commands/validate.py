from django.core.management.base import CommandError

from toric.documents import dump_complex, dumps, read_document, report
from toric.exceptions import InvalidComplex, ToricError
from toric.normality import incidence_table

from ._pipeline import PipelineCommand


class Command(PipelineCommand):
    help = "Validate a complex document and echo it in canonical form."

    def handle(self, *args, **options):
        document = None
        try:
            document = read_document(options["path"])
            mc = document.build(options["char"])
        except InvalidComplex as exc:
            data = report(document, validation={
                "valid": False,
                "violations": [v.as_dict() for v in exc.violations],
            })
            self.stdout.write(dumps(data), ending="")
            raise CommandError(exc.message, returncode=exc.exit_code) from exc
        except ToricError as exc:
            raise CommandError(exc.message, returncode=exc.exit_code) from exc
        self.stdout.write(dumps(self.run(document, mc, options)), ending="")

    def run(self, document, mc, options):
        table = incidence_table(mc)
        return report(
            document,
            validation={
                "valid": True,
                "mode": mc.mode,
                "dimension": mc.dimension,
                "facets": len(mc.facets),
                "cones": len(mc.cones),
                "incidences": {f"{mc.name(t)} < {mc.name(F)}": d for (t, F), d in table.items()},
            },
            complex=dump_complex(mc),
        )
