from hypothesis import settings

# Searches on 7-9 column diagrams run well past hypothesis's default deadline.
settings.register_profile("default", deadline=None)
settings.load_profile("default")
