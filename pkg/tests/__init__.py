# empty __init__.py to mark folder as a package
