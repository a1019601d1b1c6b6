import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "FaceRing.settings")
django.setup()
