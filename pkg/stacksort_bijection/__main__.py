from stacksort_bijection.cli import main

main()
