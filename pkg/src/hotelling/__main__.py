from hotelling.cli import main

main()
