from kpc.cli.main import main

main()
