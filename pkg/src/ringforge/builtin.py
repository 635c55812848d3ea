"""Definitions available to every command without a definitions file."""

BUILTIN_DEFINITIONS = """\
polyring plane2 = fp 2 vars [x,y]
polyring plane3 = fp 3 vars [x,y]

polygon triangle in plane2 {
  edges = [[y], [x], [x+y+1]];
  vertices = [[x,y], [x,y+1], [x+1,y]]
}
polygon triangle3 in plane3 {
  edges = [[y], [x], [x+y-1]];
  vertices = [[x,y], [x,y-1], [x-1,y]]
}
polygon square in plane3 {
  edges = [[y], [x], [y-1], [x-1]];
  vertices = [[x,y], [x,y-1], [x-1,y-1], [x-1,y]]
}

spectrum axes in plane2 = [[0], [x], [y], [x,y]]
spectrum parabola in plane3 = [[y-x^2], [y-1]]
spectrum crossing in plane3 = [[x], [y]]

tower fpbar2 = fpbar 2 levels [1,2,6,24]
"""
