// outcome: value
var obj = {
  "x" : 0,
  "setX": function(val) { this.x = val } };

print(window.x);
obj.setX(10);
print(obj.x);
var f = obj.setX;
f(90);
print(obj.x);
print(window.x);
