# Accepts exactly the 0-bit pictures of even width: columns must alternate
# odd, even, odd, ..., even from the left frame to the right frame.
state odd
state even
tile B B B ./odd
tile B B ./odd ./even
tile B B ./even ./odd
tile B B ./even B
tile B ./odd B ./odd
tile ./odd ./even ./odd ./even
tile ./even ./odd ./even ./odd
tile ./even B ./even B
tile B ./odd B B
tile ./odd ./even B B
tile ./even ./odd B B
tile ./even B B B
