"""Bundled figure presets, loaded through rabi_ent.cli.load_preset."""
