'''
Arc-length curves from an intrinsic fraction function and an angular function,
with the numeric Frenet apparatus used to check them.
'''
import icurves.util

import icurves.exprlang
import icurves.numerics
import icurves.frenet
import icurves.intrinsic
import icurves.families
import icurves.curvefile
import icurves.recipe
